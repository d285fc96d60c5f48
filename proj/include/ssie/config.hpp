#pragma once

namespace ssie {

/// Set the process-wide default worker count (0 restores "not set").
void set_default_threads(int n);

/// Resolve a thread-count request: explicit value > 0 wins, then the
/// process-wide default, then the SSIE_THREADS environment variable,
/// then 1 (serial).
int resolve_threads(int requested);

} // namespace ssie
