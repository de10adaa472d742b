package time.bell;

public class ClockTower {
  int hourHand;
  int minuteHand;

  public void tickOnce() {
    minuteHand = minuteHand + 1;
    if (minuteHand >= 60) {
      minuteHand = 0;
      hourHand = hourHand + 1;
    }
  }

  public int chimeHour() {
    return hourHand;
  }

  public int minuteNow() {
    return minuteHand;
  }
}
