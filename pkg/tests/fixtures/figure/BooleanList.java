package abacus.util;

public class BooleanList {
  boolean[] elementData;
  int size = 0;

  public boolean contains(boolean e) {
    return indexOf(e) >= 0;
  }

  public int indexOf(boolean e) {
    int i = 0;
    while (i < size) {
      if (elementData[i] == e) {
        return i;
      }
      i = i + 1;
    }
    return -1;
  }

  public boolean set(int i, boolean e) {
    rangeCheck(i);
    boolean old = elementData[i];
    elementData[i] = e;
    return old;
  }

  void rangeCheck(int i) {
    if (i >= size) {
      throw new RuntimeException();
    }
  }
}
