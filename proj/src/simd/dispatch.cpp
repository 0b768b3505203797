#include <cstdlib>
#include <string_view>

#include "hcf/simd/kernels.hpp"

namespace hcf::simd {

std::string_view to_string(Isa isa)
{
    switch (isa) {
    case Isa::scalar:
        return "scalar";
    case Isa::avx2:
        return "avx2";
    }
    return "unknown";
}

bool cpu_supports(Isa isa)
{
    switch (isa) {
    case Isa::scalar:
        return true;
    case Isa::avx2:
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
        return avx2_kernels() != nullptr && __builtin_cpu_supports("avx2") &&
               __builtin_cpu_supports("fma");
#else
        return false;
#endif
    }
    return false;
}

namespace {

const KernelTable& select()
{
    if (const char* forced = std::getenv("HCF_SIMD"); forced != nullptr &&
                                                      std::string_view(forced) == "scalar") {
        return scalar_kernels();
    }
    if (cpu_supports(Isa::avx2)) {
        return *avx2_kernels();
    }
    return scalar_kernels();
}

} // namespace

const KernelTable& active_kernels()
{
    static const KernelTable& chosen = select();
    return chosen;
}

} // namespace hcf::simd
