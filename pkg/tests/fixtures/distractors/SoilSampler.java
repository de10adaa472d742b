package farm.soil;

public class SoilSampler {
  double moistureLevel;
  double acidityLevel;
  int probeDepthCm;

  public double sampleMoisture(int depth) {
    probeDepthCm = depth;
    return moistureLevel;
  }

  public double acidityProbe() {
    return acidityLevel;
  }

  public void recalibrate(double moisture, double acidity) {
    moistureLevel = moisture;
    acidityLevel = acidity;
  }
}
