package io.tree;

public class FileWalker {
  String rootPath;
  int maxDepth;

  public void walkTree(String start) {
    visitNode(start, 0);
  }

  void visitNode(String node, int depth) {
    if (depth >= maxDepth) {
      return;
    }
    visitNode(node, depth + 1);
  }

  public int pathDepth() {
    return maxDepth;
  }
}
