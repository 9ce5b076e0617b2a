// Runs the full acceptance matrix and prints one line per criterion.

#include "causticlab/runner.hpp"

#include <cstdio>
#include <thread>

int main() {
  causticlab::VerifyOptions options;
  options.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const auto summary = causticlab::verify_all(options);
  for (const auto& c : summary.criteria)
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", causticlab::to_string(c.status).c_str(), c.id, c.name.c_str(),
                c.detail.c_str(), c.seconds);
  return summary.all_passed() ? 0 : 1;
}
