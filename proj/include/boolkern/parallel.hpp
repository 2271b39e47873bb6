#pragma once

namespace boolkern {

/// Caps the worker threads used by Gram construction and per-user solves.
/// 0 restores the runtime default. No-op without OpenMP.
void set_worker_count(int workers);
int worker_count();

}  // namespace boolkern
