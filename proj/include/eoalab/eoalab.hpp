// Copyright 2026 The eoalab Authors
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

#include "eoalab/catalog.hpp"
#include "eoalab/channels.hpp"
#include "eoalab/distill/pgm.hpp"
#include "eoalab/distill/protocols.hpp"
#include "eoalab/distill/source.hpp"
#include "eoalab/distill/types.hpp"
#include "eoalab/errors.hpp"
#include "eoalab/io.hpp"
#include "eoalab/measures.hpp"
#include "eoalab/qcore.hpp"
#include "eoalab/random.hpp"
#include "eoalab/report.hpp"
#include "eoalab/states.hpp"
