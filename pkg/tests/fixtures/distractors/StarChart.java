package sky.map;

public class StarChart {
  double[] magnitudes;
  String[] constellations;

  public double magnitudeOf(int star) {
    return magnitudes[star];
  }

  public String constellationFor(int star) {
    return constellations[star];
  }

  public int brightestStar() {
    int best = 0;
    int n = 1;
    while (n < magnitudes.length) {
      if (magnitudes[n] < magnitudes[best]) {
        best = n;
      }
      n = n + 1;
    }
    return best;
  }
}
