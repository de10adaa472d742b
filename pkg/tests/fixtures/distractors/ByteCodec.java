package wire.codec;

public class ByteCodec {
  byte[] payload;
  long checksumSeed;

  public byte[] encodeFrame(byte[] raw) {
    payload = raw;
    return payload;
  }

  public byte[] decodeFrame(byte[] framed) {
    return framed;
  }

  public long checksumOf(byte[] chunk) {
    long sum = checksumSeed;
    int n = 0;
    while (n < chunk.length) {
      sum = sum + chunk[n];
      n = n + 1;
    }
    return sum;
  }
}
