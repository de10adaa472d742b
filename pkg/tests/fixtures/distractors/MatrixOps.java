package math.grid;

public class MatrixOps {
  double[] cells;
  int rowCount;
  int colCount;

  public double cellAt(int i, int j) {
    return cells[i * colCount + j];
  }

  public void putCell(int i, int j, double value) {
    cells[i * colCount + j] = value;
  }

  public double traceSum() {
    double acc = 0.0;
    int i = 0;
    while (i < rowCount) {
      acc = acc + cellAt(i, i);
      i = i + 1;
    }
    return acc;
  }
}
