#include <chrono>
#include <cstdio>
#include <exception>

#include "hopfsym/acceptance.hpp"

int main() {
  int failed = 0;
  for (const auto& run : hopfsym::acceptance::all_checks()) {
    const auto start = std::chrono::steady_clock::now();
    hopfsym::acceptance::Check c;
    try {
      c = run();
    } catch (const std::exception& e) {
      c.pass = false;
      c.summary = std::string("error: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s [%.1fs]\n", hopfsym::acceptance::line(c).c_str(), secs);
    std::fflush(stdout);
    failed += c.pass ? 0 : 1;
  }
  std::printf("%d of 9 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
