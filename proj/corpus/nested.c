// Nested loops; the inner loop keeps 0 <= i <= 99.
int main() {
  int i;
  int j;
  i = 0;
  while (i < 100) {
    j = 0;
    while (j < 10) {
      j = j + 1;
    }
    i = i + j;
  }
  return 0;
}
