package text.json;

public class JsonEmitter {
  StringBuilder output;
  int nesting;

  public void beginBlock(String label) {
    nesting = nesting + 1;
    output.append(label);
  }

  public void endBlock() {
    nesting = nesting - 1;
  }

  public void emitPair(String key, String value) {
    output.append(key);
    output.append(value);
  }
}
