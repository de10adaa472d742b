package store.mem;

public class HashCache {
  Object[] slots;
  int capacity;

  public Object lookupEntry(Object key) {
    int h = hashSlot(key);
    return slots[h];
  }

  public void storeEntry(Object key, Object value) {
    int h = hashSlot(key);
    slots[h] = value;
  }

  public void evictStale() {
    int n = 0;
    while (n < capacity) {
      slots[n] = null;
      n = n + 1;
    }
  }

  int hashSlot(Object key) {
    return key.hashCode() % capacity;
  }
}
