// SPDX-License-Identifier: Apache-2.0
//
// capa: mutual-coupling-aware beamforming for continuous aperture arrays
// Copyright (C) 2026 The capa authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Minimal use of the library: optimal gain of a 0.5 m x 0.5 m copper aperture
// toward broadside, with and without coupling.

#include "capa/capa.hpp"

#include <cstdio>

int main()
{
    using namespace capa;
    const PhysicalConfig cfg = PhysicalConfig::from_material(2.4e9);
    const Aperture ap{0.5, 0.5};
    const FarFieldChannel ch = far_field_channel(cfg, {0.0, 0.0}, 50.0);

    const double ka = KernelApproximation(cfg, ap, 20).gain(ch);
    const double cg = ConjugateGradientSolver(cfg, ap, 20).gain(ch);
    const double mf = uncoupled_beamformer(ch, ap, 1.0, cfg.surface_resistance).gain();

    std::printf("kernel approximation  %.6f\n", ka);
    std::printf("conjugate gradient    %.6f\n", cg);
    std::printf("uncoupled model       %.6f\n", mf);
    return 0;
}
