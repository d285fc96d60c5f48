#include "ssie/config.hpp"

#include <cstdlib>
#include <string>

namespace ssie {

namespace {
int g_default_threads = 0;
}

void set_default_threads(int n) { g_default_threads = n > 0 ? n : 0; }

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (g_default_threads > 0) return g_default_threads;
    if (const char* env = std::getenv("SSIE_THREADS")) {
        try {
            int n = std::stoi(env);
            if (n > 0) return n;
        } catch (...) {
        }
    }
    return 1;
}

} // namespace ssie
