package home.light;

public class LampDimmer {
  int wattageNow;
  int wattageCeiling;

  public void dimLamp(int step) {
    wattageNow = wattageNow - step;
    clampWattage();
  }

  public void brightenLamp(int step) {
    wattageNow = wattageNow + step;
    clampWattage();
  }

  void clampWattage() {
    if (wattageNow > wattageCeiling) {
      wattageNow = wattageCeiling;
    }
    if (wattageNow < 0) {
      wattageNow = 0;
    }
  }
}
