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
#include "nap/feature_io.h"

#include <fstream>

#include "binary_io.h"
#include "nap/error.h"

namespace nap {

void write_feature_dump(const FrameMatrix& fm, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::kIo, "cannot write " + path.string());
  out.write("NAPF", 4);
  detail::put_u32(out, static_cast<std::uint32_t>(fm.rows()));
  detail::put_u32(out, static_cast<std::uint32_t>(fm.cols()));
  detail::put_u32(out, static_cast<std::uint32_t>(fm.frontend));
  for (Eigen::Index i = 0; i < fm.rows(); ++i)
    for (Eigen::Index j = 0; j < fm.cols(); ++j) detail::put_f64(out, fm.data(i, j));
}

FrameMatrix read_feature_dump(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::kPathNotFound, path.string());
  std::uint32_t rows = 0, cols = 0, id = 0;
  if (!detail::get_magic(in, "NAPF")) fail(Errc::kCorruptFile, path.string() + ": bad magic");
  if (!detail::get_u32(in, rows) || !detail::get_u32(in, cols) || !detail::get_u32(in, id))
    fail(Errc::kCorruptFile, path.string() + ": truncated header");
  if (id != static_cast<std::uint32_t>(Frontend::kPlp13) &&
      id != static_cast<std::uint32_t>(Frontend::kMfcc39))
    fail(Errc::kCorruptFile, path.string() + ": unknown frontend id " + std::to_string(id));
  FrameMatrix fm;
  fm.frontend = static_cast<Frontend>(id);
  fm.data.resize(rows, cols);
  for (std::uint32_t i = 0; i < rows; ++i)
    for (std::uint32_t j = 0; j < cols; ++j)
      if (!detail::get_f64(in, fm.data(i, j)))
        fail(Errc::kCorruptFile, path.string() + ": truncated payload");
  return fm;
}

}  // namespace nap
