// dovetail/features.cc

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

#include "dovetail/features.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "dovetail/common.h"

static_assert(std::endian::native == std::endian::little,
              "the feature file payload is little-endian float64");

namespace dovetail {

int FeatureSequence::TotalDim() const {
  int d = 0;
  for (const FeatureStream& s : streams) d += s.dim;
  return d;
}

int FeatureSequence::StreamOffset(int stream) const {
  int off = 0;
  for (int s = 0; s < stream; ++s) off += streams[s].dim;
  return off;
}

void SaveFeatures(const FeatureSequence& f, const std::string& path) {
  if (f.data.size() != static_cast<size_t>(f.frame_count) * f.TotalDim()) {
    throw DataError("feature data size does not match frames x dims");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << "dovetail-features 1\n";
  out << "recording " << f.recording_id << "\n";
  out << "frame_period_ms " << f.frame_period_ms << "\n";
  out << "channel_count " << f.channel_count << "\n";
  out << "frames " << f.frame_count << "\n";
  out << "streams " << f.streams.size() << "\n";
  for (const FeatureStream& s : f.streams) {
    out << "stream " << s.name << " " << s.dim << "\n";
  }
  out << "data\n";
  out.write(reinterpret_cast<const char*>(f.data.data()),
            static_cast<std::streamsize>(f.data.size() * sizeof(double)));
  if (!out) throw DataError("short write to " + path);
}

FeatureSequence LoadFeatures(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);

  FeatureSequence f;
  std::string line;
  if (!std::getline(in, line) || Trim(line) != "dovetail-features 1") {
    throw DataError(path + ": not a dovetail-features file");
  }
  int declared_streams = -1;
  bool saw_data = false;
  while (std::getline(in, line)) {
    std::vector<std::string> tok = SplitWhitespace(line);
    if (tok.empty()) throw DataError(path + ": blank header line");
    if (tok[0] == "data") {
      saw_data = true;
      break;
    }
    if (tok[0] == "recording" && tok.size() == 2) {
      f.recording_id = tok[1];
    } else if (tok[0] == "frame_period_ms" && tok.size() == 2) {
      f.frame_period_ms = ParseInt(tok[1], path + ": frame_period_ms");
    } else if (tok[0] == "channel_count" && tok.size() == 2) {
      f.channel_count = static_cast<int>(ParseInt(tok[1], path + ": channel_count"));
    } else if (tok[0] == "frames" && tok.size() == 2) {
      f.frame_count = static_cast<int>(ParseInt(tok[1], path + ": frames"));
    } else if (tok[0] == "streams" && tok.size() == 2) {
      declared_streams = static_cast<int>(ParseInt(tok[1], path + ": streams"));
    } else if (tok[0] == "stream" && tok.size() == 3) {
      FeatureStream s;
      s.name = tok[1];
      s.dim = static_cast<int>(ParseInt(tok[2], path + ": stream dim"));
      if (s.dim < 1) throw DataError(path + ": stream dim must be positive");
      f.streams.push_back(std::move(s));
    } else {
      throw DataError(path + ": unknown header line '" + Trim(line) + "'");
    }
  }
  if (!saw_data) throw DataError(path + ": missing data marker");
  if (f.recording_id.empty()) throw DataError(path + ": missing recording id");
  if (f.frame_period_ms < 1) throw DataError(path + ": bad frame period");
  if (f.channel_count < 1) throw DataError(path + ": bad channel count");
  if (f.frame_count < 0) throw DataError(path + ": bad frame count");
  if (declared_streams != static_cast<int>(f.streams.size())) {
    throw DataError(path + ": stream count mismatch");
  }
  size_t values = static_cast<size_t>(f.frame_count) * f.TotalDim();
  f.data.resize(values);
  in.read(reinterpret_cast<char*>(f.data.data()),
          static_cast<std::streamsize>(values * sizeof(double)));
  if (static_cast<size_t>(in.gcount()) != values * sizeof(double)) {
    throw DataError(path + ": truncated payload");
  }
  char extra;
  if (in.read(&extra, 1)) throw DataError(path + ": trailing bytes after payload");
  return f;
}

void GatherStream(const FeatureSequence& f, int stream,
                  const std::vector<int>& frames, std::vector<double>* out) {
  if (stream < 0 || stream >= static_cast<int>(f.streams.size())) {
    throw DataError("stream index out of range");
  }
  const int dim = f.streams[stream].dim;
  const int off = f.StreamOffset(stream);
  out->resize(frames.size() * dim);
  double* dst = out->data();
  for (int frame : frames) {
    std::memcpy(dst, f.Row(frame) + off, sizeof(double) * dim);
    dst += dim;
  }
}

}  // namespace dovetail
