// Copyright (c) 2026 the dcen authors.
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

#ifndef DCEN_DATASET_IO_HPP_
#define DCEN_DATASET_IO_HPP_

#include <filesystem>
#include <string>

#include "dcen/data_model.hpp"

namespace dcen {

// On-disk layout of a dataset directory:
//   attributes.csv   header "class_id,a_0,...,a_{D-1}", one row per class
//   split.txt        lines "class_id,{seen|unseen}"
//   data/index.csv   header "sample_id,class_id,split,file"
//   data/sample_NNNNNN.bin  per-sample record:
//     magic "DCS1" | u32 sample_id | u32 class_id | u32 ndim | u32 dims[ndim]
//     | f32 data[prod(dims)]            (all fields little-endian)
// Attribute values are written with 9 significant digits, which round-trips
// float32 exactly.

/// Writes the three dataset artifacts under out_dir. Creates directories.
void save_dataset(const GZSLDataset& ds, const std::filesystem::path& out_dir);

/// Loads a dataset from explicit file locations. Throws ParseError with the
/// offending file/line/record on malformed input, including ragged attribute
/// rows and split entries that reference unknown class ids. The returned
/// dataset passes validate_dataset; violations are reported as errors.
GZSLDataset load_dataset(const std::filesystem::path& attr_path,
                         const std::filesystem::path& split_path,
                         const std::filesystem::path& data_dir);

/// Convenience wrapper using the standard names inside one directory.
GZSLDataset load_dataset_dir(const std::filesystem::path& dir);

}  // namespace dcen

#endif  // DCEN_DATASET_IO_HPP_
