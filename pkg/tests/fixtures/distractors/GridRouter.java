package net.mesh;

public class GridRouter {
  int[] hopWeights;
  int nodeTally;

  public int routeHop(int fromNode, int toNode) {
    return hopWeights[fromNode] + hopWeights[toNode];
  }

  public void reweighHop(int node, int weight) {
    hopWeights[node] = weight;
  }

  public int nodeCount() {
    return nodeTally;
  }
}
