// Command-line front end. Subcommands land here as the library fills in.
#include <cstdio>

int main(int argc, char** argv) {
  (void)argv;
  if (argc < 2) {
    std::fprintf(stderr, "usage: wsigma <verify-algebra|verify-geometry|verify-variation|solve|scan|report> [options]\n");
    return 2;
  }
  std::fprintf(stderr, "wsigma: subcommands not wired up yet\n");
  return 2;
}
