#include "navsim/kernels.hpp"

namespace navsim::kernels {

const Ops& ops() {
  static const Ops* selected = [] {
    if (const Ops* v = avx2_ops()) return v;
    return &scalar_ops();
  }();
  return *selected;
}

const char* active_variant_name() {
  return &ops() == &scalar_ops() ? "scalar" : "avx2";
}

}  // namespace navsim::kernels
