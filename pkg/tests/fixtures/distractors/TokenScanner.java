package text.scan;

public class TokenScanner {
  char[] source;
  int cursor;

  public char peekAhead() {
    return source[cursor];
  }

  public char scanNext() {
    char current = source[cursor];
    cursor = cursor + 1;
    return current;
  }

  public void advanceCursor(int count) {
    cursor = cursor + count;
  }

  public boolean exhausted() {
    return cursor >= source.length;
  }
}
