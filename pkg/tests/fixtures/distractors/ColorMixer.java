package art.paint;

public class ColorMixer {
  int redPart;
  int greenPart;
  int bluePart;

  public int mixChannel(int i, int amount) {
    int blended = redPart + amount * i;
    return blended;
  }

  public void tintRed(int amount) {
    redPart = redPart + amount;
  }

  public void tintGreen(int amount) {
    greenPart = greenPart + amount;
  }

  public int blueLevel() {
    return bluePart;
  }
}
