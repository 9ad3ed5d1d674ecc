// Copyright 2026 The spu Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "spu/block_encoding.hpp"
#include "spu/circuit.hpp"
#include "spu/config.hpp"
#include "spu/diagnostics.hpp"
#include "spu/error.hpp"
#include "spu/hamiltonian.hpp"
#include "spu/mcmc_spu.hpp"
#include "spu/qite.hpp"
#include "spu/qmetts.hpp"
#include "spu/random.hpp"
#include "spu/resources.hpp"
#include "spu/simulator.hpp"
