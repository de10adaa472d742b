package java.util;

public class Vector<E> {
  transient Object[] elementData;
  int elementCount;

  public boolean contains(Object o) {
    return indexOf(o) >= 0;
  }

  public int indexOf(Object o) {
    int i = 0;
    while (i < elementCount) {
      if (elementData[i] == o) {
        return i;
      }
      i = i + 1;
    }
    return -1;
  }

  public E set(int i, E element) {
    if (i >= elementCount) {
      throw new ArrayIndexOutOfBoundsException(i);
    }
    E old = elementData[i];
    elementData[i] = element;
    return old;
  }
}
