package print.dev;

public class InkPrinter {
  int cartridgeLevel;
  int pagesFed;

  public void printPage(String body) {
    feedPage();
    cartridgeLevel = cartridgeLevel - body.length();
  }

  void feedPage() {
    pagesFed = pagesFed + 1;
  }

  public int inkRemaining() {
    return cartridgeLevel;
  }
}
