package store.guard;

public class FrozenRegistry {
  final Object[] entries;
  boolean sealed;

  public void freeze() {
    sealed = true;
  }

  public void deny(Object e) {
    throw new UnsupportedOperationException();
  }

  public void register(Object e) {
    throw new UnsupportedOperationException();
  }

  public boolean sealCheck() {
    return sealed;
  }
}
