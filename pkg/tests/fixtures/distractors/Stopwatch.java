package time.util;

public class Stopwatch {
  long startNanos;
  boolean running;

  public void startTick() {
    running = true;
    startNanos = now();
  }

  public long stopTick() {
    running = false;
    return now() - startNanos;
  }

  public long elapsedNanos() {
    return now() - startNanos;
  }

  long now() {
    return System.nanoTime();
  }
}
