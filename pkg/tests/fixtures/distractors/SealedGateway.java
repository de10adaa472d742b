package store.guard;

public class SealedGateway {
  boolean barred;
  String gateName;

  public void openGate(Object e) {
    throw new UnsupportedOperationException();
  }

  public void rejectEntry(Object e) {
    throw new UnsupportedOperationException();
  }

  public void closeGate() {
    barred = true;
  }

  public String gateLabel() {
    return gateName;
  }
}
