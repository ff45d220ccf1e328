#include "depcon/numeric.hpp"

#include <cstdlib>
#include <string>

namespace depcon {

std::size_t default_thread_count() {
    if (const char* env = std::getenv("DEPCON_THREADS")) {
        try {
            const long value = std::stol(env);
            if (value > 0) {
                return static_cast<std::size_t>(value);
            }
        } catch (const std::exception&) {
            // ignore malformed values and fall through
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

std::size_t resolve_threads(std::size_t requested) {
    return requested == 0 ? default_thread_count() : requested;
}

} // namespace depcon
