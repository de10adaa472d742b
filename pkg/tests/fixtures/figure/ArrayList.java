package java.util;

public class ArrayList<E> {
  transient Object[] elementData;
  int size;

  public boolean contains(Object o) {
    return indexOf(o) >= 0;
  }

  public int indexOf(Object o) {
    int i = 0;
    while (i < size) {
      if (elementData[i] == o) {
        return i;
      }
      i = i + 1;
    }
    return -1;
  }

  public E set(int i, E element) {
    Objects.checkIndex(i, size);
    E old = elementData[i];
    elementData[i] = element;
    return old;
  }
}
