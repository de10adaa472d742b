package net.web;

public class HttpFetcher {
  String endpoint;
  int retryCount;
  int statusCode;

  public String fetchBody(String resource) {
    statusCode = 200;
    return endpoint + resource;
  }

  public int lastStatus() {
    return statusCode;
  }

  public void bumpRetries() {
    retryCount = retryCount + 1;
  }
}
