// Copyright 2026 The Adaptive ZNE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AZNE_AZNE_HPP
#define AZNE_AZNE_HPP

#include "azne/adaptive.hpp"
#include "azne/benchmarks.hpp"
#include "azne/calibration.hpp"
#include "azne/circuit.hpp"
#include "azne/density_matrix.hpp"
#include "azne/extrapolation.hpp"
#include "azne/filtering.hpp"
#include "azne/folding.hpp"
#include "azne/harness.hpp"
#include "azne/io.hpp"
#include "azne/noise.hpp"
#include "azne/rational.hpp"
#include "azne/rng.hpp"
#include "azne/simulator.hpp"

#endif
