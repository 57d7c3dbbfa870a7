// Outer loop never exits; the inner loop keeps 1 <= i <= 10.
int main() {
  int i;
  int j;
  i = 0;
  while (TRUE) {
    i = i + 1;
    j = 0;
    while (j < 10) {
      j = j + 1;
    }
    if (i > 9) i = 0;
  }
  return 0;
}
