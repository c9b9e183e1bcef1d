// dovetail/features.h

// Copyright 2026  The dovetail authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DOVETAIL_FEATURES_H_
#define DOVETAIL_FEATURES_H_

#include <cstdint>
#include <string>
#include <vector>

namespace dovetail {

struct FeatureStream {
  std::string name;
  int dim = 0;
};

// Frame-synchronous features, two parallel streams stored interleaved per
// frame. File format: a short text header followed by the raw payload,
//
//   dovetail-features 1
//   recording <id>
//   frame_period_ms <int>
//   channel_count <int>
//   frames <int>
//   streams <count>
//   stream <name> <dim>   (repeated)
//   data
//   <frames x total_dim little-endian float64, row-major>
//
struct FeatureSequence {
  std::string recording_id;
  int64_t frame_period_ms = 10;
  int channel_count = 1;
  std::vector<FeatureStream> streams;
  int frame_count = 0;
  std::vector<double> data;  // frame-major, total_dim values per frame

  int TotalDim() const;
  int StreamOffset(int stream) const;
  const double* Row(int frame) const {
    return data.data() + static_cast<size_t>(frame) * TotalDim();
  }
};

void SaveFeatures(const FeatureSequence& features, const std::string& path);
FeatureSequence LoadFeatures(const std::string& path);

// Copies one stream of the given frames into a dense row-major buffer.
void GatherStream(const FeatureSequence& features, int stream,
                  const std::vector<int>& frames, std::vector<double>* out);

}  // namespace dovetail

#endif  // DOVETAIL_FEATURES_H_
