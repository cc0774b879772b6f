// include/strfnet/wav.h

// Copyright 2026  The strfnet Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef STRFNET_WAV_H_
#define STRFNET_WAV_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "strfnet/frontend.h"

namespace strfnet {

// Mono 16-bit little-endian PCM only. Samples are scaled to [-1, 1) on read
// and clipped on write.
Waveform ReadWav(std::istream &is);
Waveform ReadWavFile(const std::string &path);
void WriteWav(const Waveform &wave, std::ostream &os);
void WriteWavFile(const Waveform &wave, const std::string &path);

}  // namespace strfnet

#endif  // STRFNET_WAV_H_
