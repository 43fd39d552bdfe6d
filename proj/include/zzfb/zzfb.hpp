// Copyright 2026 The zzfb Authors
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

#pragma once

#include "zzfb/config.hpp"
#include "zzfb/csv.hpp"
#include "zzfb/density_matrix.hpp"
#include "zzfb/ensemble.hpp"
#include "zzfb/feedback.hpp"
#include "zzfb/local_ops.hpp"
#include "zzfb/metrics.hpp"
#include "zzfb/pauli.hpp"
#include "zzfb/rng.hpp"
#include "zzfb/sme.hpp"
