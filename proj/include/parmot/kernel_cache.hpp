#ifndef PARMOT_KERNEL_CACHE_HPP
#define PARMOT_KERNEL_CACHE_HPP

#include <functional>
#include <string>

#include "parmot/genfun.hpp"

namespace parmot {

inline constexpr const char* kCodeVersion = "parmot-1";

// Optional persistence hooks for the kernel memo (installed by the CLI).
// The loader returns true and fills the kernels on a usable cache entry;
// corrupt entries must return false so the caller recomputes.
using KernelLoader = std::function<bool(const GenFunParams&, Kernels&)>;
using KernelSaver = std::function<void(const GenFunParams&, const Kernels&)>;

void set_kernel_cache_hooks(KernelLoader loader, KernelSaver saver);
void clear_kernel_cache_hooks();

}  // namespace parmot

#endif
