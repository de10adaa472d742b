package flow.pipe;

public class QueuePump {
  Object[] backlog;
  int head;
  int tail;

  public void pushItem(Object item) {
    backlog[tail] = item;
    tail = tail + 1;
  }

  public Object popItem() {
    Object item = backlog[head];
    head = head + 1;
    return item;
  }

  public void drainAll() {
    while (head < tail) {
      popItem();
    }
  }
}
