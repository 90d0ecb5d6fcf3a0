#ifndef DYNSPARSIFY_LOG_HPP
#define DYNSPARSIFY_LOG_HPP

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace dynsparsify {

// DYNSPARSIFY_LOG=info or DYNSPARSIFY_LOG=debug enables stderr notes.
inline int log_level() {
  static int lvl = [] {
    const char* s = std::getenv("DYNSPARSIFY_LOG");
    if (!s) return 0;
    if (std::strcmp(s, "debug") == 0) return 2;
    if (std::strcmp(s, "info") == 0) return 1;
    return 0;
  }();
  return lvl;
}

template <class... Args>
void log_info(const char* fmt, Args... args) {
  if (log_level() >= 1) {
    std::fprintf(stderr, "[dynsparsify] ");
    std::fprintf(stderr, fmt, args...);
    std::fprintf(stderr, "\n");
  }
}

template <class... Args>
void log_debug(const char* fmt, Args... args) {
  if (log_level() >= 2) {
    std::fprintf(stderr, "[dynsparsify] ");
    std::fprintf(stderr, fmt, args...);
    std::fprintf(stderr, "\n");
  }
}

}  // namespace dynsparsify

#endif
