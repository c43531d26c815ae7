// Copyright 2026 The attrscale Authors. All Rights Reserved.
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


// Convenience header pulling in the whole library.

#pragma once

#include "attrscale/analytics.hpp"
#include "attrscale/catalog.hpp"
#include "attrscale/cli.hpp"
#include "attrscale/errors.hpp"
#include "attrscale/exchange.hpp"
#include "attrscale/matrix.hpp"
#include "attrscale/numeric_scale.hpp"
#include "attrscale/snapshot.hpp"
#include "attrscale/sql_columns.hpp"
#include "attrscale/workload.hpp"
