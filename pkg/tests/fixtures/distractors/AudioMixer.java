package sound.desk;

public class AudioMixer {
  double[] faders;
  int channelTally;

  public void playTrack(int i) {
    faders[i] = 1.0;
  }

  public void pauseTrack(int i) {
    faders[i] = 0.0;
  }

  public double volumeFor(int i) {
    return faders[i];
  }

  public int channelsLive() {
    return channelTally;
  }
}
