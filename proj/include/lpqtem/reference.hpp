#pragma once

// Serial, unoptimized routes kept as oracles for the table-based parallel kernels.

#include "lpqtem/kernel.hpp"
#include "lpqtem/mixed_norm.hpp"

namespace lpq::reference {

// f(x, y) evaluated node by node.
GridFunction render_pointwise(const VSignal& f, const Grid& grid);
// <f, phi~_k> by direct quadrature for every k, then the kernel's coefficient map.
CoefSeq analysis_pointwise(const SpanKernel& k, const GridFunction& f);
// Plain weighted power sums, no rescaling.
double mixed_norm_direct(const GridFunction& f, const MixedNormParams& pq);

}  // namespace lpq::reference
