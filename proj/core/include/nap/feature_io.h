// Copyright 2026 The NAP Authors. All Rights Reserved.
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

#include <filesystem>

#include "nap/frontend.h"

namespace nap {

// "NAPF" | u32 rows | u32 cols | u32 frontend id | rows*cols f64, row-major,
// all little-endian.
void write_feature_dump(const FrameMatrix& fm, const std::filesystem::path& path);
FrameMatrix read_feature_dump(const std::filesystem::path& path);

}  // namespace nap
