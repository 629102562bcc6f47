// Copyright 2026 The HSC Text Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License"); you
// may not use this file except in compliance with the License. You may
// obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Everything except the OpenCV-backed synthetic corpus (hsc/synth.hpp).

#pragma once

#include "hsc/annotations.hpp"
#include "hsc/benchmark.hpp"
#include "hsc/classifiers.hpp"
#include "hsc/common.hpp"
#include "hsc/detector.hpp"
#include "hsc/eval.hpp"
#include "hsc/features.hpp"
#include "hsc/mce.hpp"
#include "hsc/pipeline.hpp"
#include "hsc/sparse.hpp"
#include "hsc/wordrec.hpp"
