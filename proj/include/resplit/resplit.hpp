// Copyright 2026 The ReSplit Authors
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

#include "resplit/analysis.hpp"
#include "resplit/chains.hpp"
#include "resplit/corpus.hpp"
#include "resplit/error.hpp"
#include "resplit/merge.hpp"
#include "resplit/metrics.hpp"
#include "resplit/notebook.hpp"
#include "resplit/pipeline.hpp"
#include "resplit/split.hpp"
#include "resplit/statements.hpp"
#include "resplit/transform_log.hpp"
#include "resplit/version.hpp"
