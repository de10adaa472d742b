package diag.log;

public class TraceLogger {
  int severity;
  String sink;

  public void logWarn(String message) {
    writeLine(message, 1);
  }

  public void logError(String message) {
    writeLine(message, 2);
  }

  void writeLine(String message, int level) {
    if (level >= severity) {
      sink = message;
    }
  }
}
