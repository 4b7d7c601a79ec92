// Copyright 2026 The PPDR Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Synthetic surrogates with the label structure of the HAR and Bank data,
// for exercising the pipeline when the real files are unavailable. They are
// not calibrated to any published accuracy.

#ifndef PPDR_SYNTH_H_
#define PPDR_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>

namespace ppdr {

// 6 activities x 30 subjects, 40 numeric features: a strong activity signal
// and a weaker subject signal in a 12-dimensional latent space, embedded by
// a random linear map plus noise. Columns match the har-surrogate preset.
void WriteHarSurrogate(std::ostream& out, std::uint64_t seed,
                       int rows_per_combination = 25);

// y in {no, yes} x marital in {divorced, married, single}, with numeric and
// categorical columns that depend on both. Columns match the bank-surrogate
// preset.
void WriteBankSurrogate(std::ostream& out, std::uint64_t seed,
                        int rows_per_combination = 450);

// Writes to a file; throws IoError.
void WriteSurrogate(const std::filesystem::path& path, std::string_view preset,
                    std::uint64_t seed);

}  // namespace ppdr

#endif  // PPDR_SYNTH_H_
