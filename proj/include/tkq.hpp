// Copyright 2026 The tkq Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

/// @file tkq.hpp
/// Umbrella header.

#pragma once

#include "tkq/bench.hpp"
#include "tkq/errors.hpp"
#include "tkq/evaluator.hpp"
#include "tkq/instance_io.hpp"
#include "tkq/io.hpp"
#include "tkq/lrqaoa.hpp"
#include "tkq/model.hpp"
#include "tkq/numeric.hpp"
#include "tkq/qubo.hpp"
#include "tkq/random.hpp"
#include "tkq/solvers.hpp"
