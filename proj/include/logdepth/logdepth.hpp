// Copyright 2026 The logdepth Authors
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

// Umbrella header.

#pragma once

#include "logdepth/channel.hpp"
#include "logdepth/circuit.hpp"
#include "logdepth/circuit_io.hpp"
#include "logdepth/factored.hpp"
#include "logdepth/gadgets.hpp"
#include "logdepth/gates.hpp"
#include "logdepth/harness.hpp"
#include "logdepth/linalg.hpp"
#include "logdepth/metrics.hpp"
#include "logdepth/optimize.hpp"
#include "logdepth/reduction.hpp"
#include "logdepth/rng.hpp"
#include "logdepth/sim.hpp"
#include "logdepth/state.hpp"
