int g = 0;

int main() {
  g = g + 1;
  return 0;
}
