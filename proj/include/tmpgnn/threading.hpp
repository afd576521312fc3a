// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace tmpgnn {

// Worker cap for OpenMP kernels. Reads SUPRA_EMBED_THREADS once; falls back
// to the OpenMP default. Always >= 1.
int max_threads();

}  // namespace tmpgnn
