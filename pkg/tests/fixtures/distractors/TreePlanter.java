package garden.grow;

public class TreePlanter {
  int seedCount;
  int branchCount;

  public void plantSeed() {
    seedCount = seedCount + 1;
  }

  public void growBranch() {
    branchCount = branchCount + 1;
  }

  public void pruneTwig() {
    if (branchCount > 0) {
      branchCount = branchCount - 1;
    }
  }

  public int canopyWidth() {
    return branchCount * 2;
  }
}
