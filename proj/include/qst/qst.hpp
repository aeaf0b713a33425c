// Copyright 2026 The qst Authors
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

#ifndef QST_QST_HPP_
#define QST_QST_HPP_

#include "qst/chain_model.hpp"
#include "qst/channel.hpp"
#include "qst/dynamics.hpp"
#include "qst/errors.hpp"
#include "qst/experiment.hpp"
#include "qst/fidelity_analytics.hpp"
#include "qst/linalg.hpp"
#include "qst/oracle.hpp"
#include "qst/sampling.hpp"
#include "qst/scalar_search.hpp"
#include "qst/sector_basis.hpp"

#endif  // QST_QST_HPP_
