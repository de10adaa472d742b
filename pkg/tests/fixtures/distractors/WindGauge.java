package weather.sense;

public class WindGauge {
  double gustPeak;
  double steadySpeed;
  int directionDeg;

  public double measureGust() {
    return gustPeak;
  }

  public double steadyReading() {
    return steadySpeed;
  }

  public void swingVane(int degrees) {
    directionDeg = degrees;
  }
}
