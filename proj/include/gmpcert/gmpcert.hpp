// Copyright 2026 The gmpcert Authors
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

// Umbrella header for the solver library. The JSON layer in gmpcert/io.hpp
// is not included here because it needs the vendored nlohmann/json header.

#include "gmpcert/core.hpp"
#include "gmpcert/errors.hpp"
#include "gmpcert/lambertw.hpp"
#include "gmpcert/newsvendor.hpp"
#include "gmpcert/oracle.hpp"
#include "gmpcert/rootfind.hpp"
#include "gmpcert/solver_1e.hpp"
#include "gmpcert/solver_1t.hpp"
#include "gmpcert/solver_upm.hpp"
