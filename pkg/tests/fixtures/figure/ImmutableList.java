package jadax.core;

public class ImmutableList<E> {
  final E[] arr;

  public boolean contains(Object o) {
    return indexOf(o) != -1;
  }

  public int indexOf(Object o) {
    int k = 0;
    while (k < arr.length) {
      if (arr[k] == o) {
        return k;
      }
      k = k + 1;
    }
    return -1;
  }

  public E set(int i, E e) {
    throw new UnsupportedOperationException();
  }
}
