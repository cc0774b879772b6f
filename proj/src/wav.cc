// src/wav.cc

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

#include "strfnet/wav.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace strfnet {

namespace {

uint32_t ReadU32(const char *p) {
  return static_cast<uint32_t>(static_cast<unsigned char>(p[0])) |
         static_cast<uint32_t>(static_cast<unsigned char>(p[1])) << 8 |
         static_cast<uint32_t>(static_cast<unsigned char>(p[2])) << 16 |
         static_cast<uint32_t>(static_cast<unsigned char>(p[3])) << 24;
}

uint16_t ReadU16(const char *p) {
  return static_cast<uint16_t>(static_cast<unsigned char>(p[0]) |
                               static_cast<unsigned char>(p[1]) << 8);
}

void PutU32(std::ostream &os, uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  os.write(b, 4);
}

void PutU16(std::ostream &os, uint16_t v) {
  char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
  os.write(b, 2);
}

}  // namespace

Waveform ReadWav(std::istream &is) {
  char riff[12];
  if (!is.read(riff, 12) || std::memcmp(riff, "RIFF", 4) != 0 ||
      std::memcmp(riff + 8, "WAVE", 4) != 0)
    throw std::runtime_error("not a RIFF/WAVE stream");

  Waveform wave;
  bool have_fmt = false;
  char hdr[8];
  while (is.read(hdr, 8)) {
    uint32_t size = ReadU32(hdr + 4);
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      std::vector<char> fmt(size);
      if (!is.read(fmt.data(), size) || size < 16)
        throw std::runtime_error("truncated fmt chunk");
      uint16_t format = ReadU16(fmt.data());
      uint16_t channels = ReadU16(fmt.data() + 2);
      uint16_t bits = ReadU16(fmt.data() + 14);
      if (format != 1 || channels != 1 || bits != 16)
        throw std::runtime_error("only mono 16-bit PCM WAV is supported");
      wave.sample_rate = static_cast<int>(ReadU32(fmt.data() + 4));
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      if (!have_fmt) throw std::runtime_error("data chunk before fmt chunk");
      std::vector<char> data(size);
      if (!is.read(data.data(), size)) throw std::runtime_error("truncated data chunk");
      wave.samples.resize(size / 2);
      for (size_t i = 0; i < wave.samples.size(); ++i)
        wave.samples[i] = static_cast<int16_t>(ReadU16(data.data() + 2 * i)) / 32768.0;
      return wave;
    } else {
      is.ignore(size + (size & 1));
    }
    if (size & 1) is.ignore(1);
  }
  throw std::runtime_error("WAV stream has no data chunk");
}

Waveform ReadWavFile(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  return ReadWav(is);
}

void WriteWav(const Waveform &wave, std::ostream &os) {
  const uint32_t data_bytes = static_cast<uint32_t>(wave.samples.size() * 2);
  os.write("RIFF", 4);
  PutU32(os, 36 + data_bytes);
  os.write("WAVEfmt ", 8);
  PutU32(os, 16);
  PutU16(os, 1);
  PutU16(os, 1);
  PutU32(os, static_cast<uint32_t>(wave.sample_rate));
  PutU32(os, static_cast<uint32_t>(wave.sample_rate) * 2);
  PutU16(os, 2);
  PutU16(os, 16);
  os.write("data", 4);
  PutU32(os, data_bytes);
  for (double s : wave.samples) {
    double v = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
    PutU16(os, static_cast<uint16_t>(static_cast<int16_t>(v)));
  }
}

void WriteWavFile(const Waveform &wave, const std::string &path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  WriteWav(wave, os);
}

}  // namespace strfnet
