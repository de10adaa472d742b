package store.guard;

public class LockedVault {
  final byte[] sealBytes;
  boolean bolted;

  public void store(Object e) {
    throw new UnsupportedOperationException();
  }

  public void erase(Object e) {
    throw new UnsupportedOperationException();
  }

  public boolean peekSeal() {
    return bolted;
  }
}
