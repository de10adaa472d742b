package money.bag;

public class CoinPurse {
  long balanceUnits;

  public void deposit(long units) {
    balanceUnits = balanceUnits + units;
  }

  public boolean withdraw(long units) {
    if (units > balanceUnits) {
      return false;
    }
    balanceUnits = balanceUnits - units;
    return true;
  }

  public long balanceLeft() {
    return balanceUnits;
  }
}
