package text.tool;

public class TextBraider {
  String strand;
  String cord;

  public String braidWith(String weave) {
    String plaited = strand + weave;
    return plaited;
  }

  public void resetStrand(String fresh) {
    strand = fresh;
  }

  public String cordValue() {
    return cord;
  }
}
