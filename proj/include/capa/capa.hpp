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

#pragma once

#include "capa/analysis.hpp"
#include "capa/cg_solver.hpp"
#include "capa/error.hpp"
#include "capa/kernel_approx.hpp"
#include "capa/physics.hpp"
#include "capa/quadrature.hpp"
#include "capa/spda.hpp"
#include "capa/types.hpp"
#include "capa/version.hpp"
