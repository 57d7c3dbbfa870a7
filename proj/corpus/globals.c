// Flow-insensitive global written from two call sites of f.
int g = 0;

void f(int b) {
  if (b) g = b + 1;
  else g = -b - 1;
}

int main() {
  f(1);
  f(2);
  return 0;
}
