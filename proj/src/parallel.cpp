#include "rmdp/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace rmdp {

namespace {
std::atomic<int> configured{0};
}

int default_threads() {
    if (const int n = configured.load(); n > 0) return n;
    if (const char* env = std::getenv("RMDP_SYNTH_THREADS")) {
        try {
            if (const int n = std::stoi(env); n > 0) return n;
        } catch (...) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void set_default_threads(int n) { configured.store(n); }

}  // namespace rmdp
