package store.guard;

public class ReadOnlyConfig {
  final String[] keys;
  final String[] values;

  public void update(Object e) {
    throw new UnsupportedOperationException();
  }

  public void mutateValue(Object e) {
    throw new UnsupportedOperationException();
  }

  public String valueFor(String key) {
    int n = 0;
    while (n < keys.length) {
      if (keys[n] == key) {
        return values[n];
      }
      n = n + 1;
    }
    return null;
  }
}
