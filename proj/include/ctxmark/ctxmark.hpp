//
// Copyright 2026 The ctxmark Authors
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
//

// Umbrella header (everything except the HTTP client).

#ifndef CTXMARK_CTXMARK_HPP_
#define CTXMARK_CTXMARK_HPP_

#include "ctxmark/backend.hpp"
#include "ctxmark/cached_backend.hpp"
#include "ctxmark/codec.hpp"
#include "ctxmark/errors.hpp"
#include "ctxmark/framing.hpp"
#include "ctxmark/lexsub.hpp"
#include "ctxmark/metrics.hpp"
#include "ctxmark/risk.hpp"
#include "ctxmark/stemmer.hpp"
#include "ctxmark/stub_backend.hpp"
#include "ctxmark/swords.hpp"
#include "ctxmark/sync.hpp"
#include "ctxmark/text.hpp"

#endif  // CTXMARK_CTXMARK_HPP_
