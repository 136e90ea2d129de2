// Copyright 2026 The Zest Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ZEST_ZEST_HPP
#define ZEST_ZEST_HPP

#include "zest/ais.hpp"
#include "zest/base.hpp"
#include "zest/dataset.hpp"
#include "zest/exact.hpp"
#include "zest/generators.hpp"
#include "zest/harness.hpp"
#include "zest/io.hpp"
#include "zest/math.hpp"
#include "zest/parallel.hpp"
#include "zest/rbm.hpp"
#include "zest/rng.hpp"
#include "zest/trainer.hpp"

#endif  // ZEST_ZEST_HPP
