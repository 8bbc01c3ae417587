// SPDX-License-Identifier: Apache-2.0
#include "latdpc/kernels.hpp"

#include <atomic>

namespace latdpc::kern {

bool have_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

namespace {

const Ops* pick_auto() {
#if defined(__x86_64__) || defined(_M_X64)
    if (have_avx2()) return &avx2_ops();
#endif
    return &scalar_ops();
}

std::atomic<const Ops*>& slot() {
    static std::atomic<const Ops*> current{nullptr};
    return current;
}

}  // namespace

const Ops& active() {
    const Ops* ops = slot().load(std::memory_order_acquire);
    if (!ops) {
        ops = pick_auto();
        slot().store(ops, std::memory_order_release);
    }
    return *ops;
}

bool select(const std::string& name) {
    if (name == "auto") {
        slot().store(pick_auto(), std::memory_order_release);
        return true;
    }
    if (name == "scalar") {
        slot().store(&scalar_ops(), std::memory_order_release);
        return true;
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (name == "avx2" && have_avx2()) {
        slot().store(&avx2_ops(), std::memory_order_release);
        return true;
    }
#endif
    return false;
}

}  // namespace latdpc::kern
