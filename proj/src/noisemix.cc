// src/noisemix.cc

// Copyright 2026  The avsr-gauge Authors
//
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

#include "avsr/noisemix.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <random>

#include "avsr/error.h"
#include "avsr/util.h"

namespace avsr {

namespace {

// FFTW's planner is not re-entrant; execution of distinct plans is.
std::mutex &FftwPlannerMutex() {
  static std::mutex mu;
  return mu;
}

void CheckRates(const AudioBuffer &a, const AudioBuffer &b) {
  if (a.sample_rate != b.sample_rate)
    throw Error(ErrorCode::kRateMismatch,
                "sample rates differ: " + std::to_string(a.sample_rate) +
                    " vs " + std::to_string(b.sample_rate));
}

double PeakAbs(std::span<const double> x) {
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::fabs(v));
  return peak;
}

}  // namespace

PeakPolicy ParsePeakPolicy(std::string_view name) {
  if (name == "rescale") return PeakPolicy::kRescale;
  if (name == "clip") return PeakPolicy::kClip;
  if (name == "error") return PeakPolicy::kError;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown peak policy '" + std::string(name) + "'");
}

std::string_view PeakPolicyName(PeakPolicy policy) {
  switch (policy) {
    case PeakPolicy::kRescale: return "rescale";
    case PeakPolicy::kClip: return "clip";
    case PeakPolicy::kError: return "error";
  }
  return "rescale";
}

double MeanPower(std::span<const double> samples) {
  if (samples.empty()) return 0.0;
  long double acc = 0.0L;
  for (double v : samples) acc += static_cast<long double>(v) * v;
  return static_cast<double>(acc / samples.size());
}

AudioBuffer GeneratePinkNoise(std::size_t n_samples, int sample_rate,
                              std::uint64_t seed) {
  if (sample_rate <= 0)
    throw Error(ErrorCode::kInvalidArgument, "sample rate must be positive");
  AudioBuffer out;
  out.sample_rate = sample_rate;
  if (n_samples == 0) return out;

  const std::size_t n = n_samples;
  const std::size_t bins = n / 2 + 1;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  fftw_complex *spec = fftw_alloc_complex(bins);
  double *time = fftw_alloc_real(n);
  spec[0][0] = spec[0][1] = 0.0;
  for (std::size_t k = 1; k < bins; ++k) {
    double weight = 1.0 / std::sqrt(static_cast<double>(k));
    double re = gauss(rng);
    double im = gauss(rng);
    // The Nyquist bin of an even-length real signal has no imaginary part.
    if (n % 2 == 0 && k == n / 2) im = 0.0;
    spec[k][0] = re * weight;
    spec[k][1] = im * weight;
  }

  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(FftwPlannerMutex());
    plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec, time,
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  out.samples.assign(time, time + n);
  {
    std::lock_guard<std::mutex> lock(FftwPlannerMutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(spec);
  fftw_free(time);

  double peak = PeakAbs(out.samples);
  if (peak > 0.0) {
    double g = 0.9 / peak;
    for (double &v : out.samples) v *= g;
  }
  return out;
}

double MeasureSnr(const AudioBuffer &speech, const AudioBuffer &noise) {
  CheckRates(speech, noise);
  double ps = MeanPower(speech.samples);
  double pn = MeanPower(noise.samples);
  if (ps <= 0.0) throw Error(ErrorCode::kSilentSpeech, "speech has zero power");
  if (pn <= 0.0) throw Error(ErrorCode::kSilentNoise, "noise has zero power");
  return 10.0 * std::log10(ps / pn);
}

std::vector<double> FitNoiseLength(std::span<const double> noise,
                                   std::size_t length) {
  std::vector<double> out(length);
  if (noise.empty()) return out;
  for (std::size_t i = 0; i < length; ++i) out[i] = noise[i % noise.size()];
  return out;
}

MixResult MixAtSnr(const AudioBuffer &speech, const AudioBuffer &noise,
                   const MixSpec &spec) {
  CheckRates(speech, noise);
  if (!std::isfinite(spec.target_snr_db))
    throw Error(ErrorCode::kInvalidArgument, "target SNR must be finite");
  double ps = MeanPower(speech.samples);
  if (ps <= 0.0) throw Error(ErrorCode::kSilentSpeech, "speech has zero power");
  std::vector<double> fitted = FitNoiseLength(noise.samples,
                                              speech.samples.size());
  double pn = MeanPower(fitted);
  if (pn <= 0.0) throw Error(ErrorCode::kSilentNoise, "noise has zero power");

  MixResult result;
  result.noise_scale =
      std::sqrt(ps / (pn * std::pow(10.0, spec.target_snr_db / 10.0)));
  result.mixture.sample_rate = speech.sample_rate;
  auto &mix = result.mixture.samples;
  mix.resize(speech.samples.size());
  for (std::size_t i = 0; i < mix.size(); ++i)
    mix[i] = speech.samples[i] + result.noise_scale * fitted[i];

  double peak = PeakAbs(mix);
  if (peak > 1.0) {
    switch (spec.peak_policy) {
      case PeakPolicy::kRescale:
        result.mixture_gain = 1.0 / peak;
        for (double &v : mix) v *= result.mixture_gain;
        break;
      case PeakPolicy::kClip:
        for (double &v : mix) {
          if (std::fabs(v) > 1.0) {
            v = std::copysign(1.0, v);
            ++result.clipped_samples;
          }
        }
        break;
      case PeakPolicy::kError:
        throw Error(ErrorCode::kPeakExceeded,
                    "mixture peak " + FormatExact(peak) + " exceeds 1");
    }
  }
  return result;
}

// ---- WAV ---------------------------------------------------------------------

namespace {

void PutU32(std::string &s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s += static_cast<char>((v >> (8 * i)) & 0xff);
}
void PutU16(std::string &s, std::uint16_t v) {
  s += static_cast<char>(v & 0xff);
  s += static_cast<char>((v >> 8) & 0xff);
}
std::uint32_t GetU32(std::string_view b, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i)
    v = (v << 8) | static_cast<unsigned char>(b[at + i]);
  return v;
}
std::uint16_t GetU16(std::string_view b, std::size_t at) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[at]) |
                                    (static_cast<unsigned char>(b[at + 1]) << 8));
}

}  // namespace

std::string EncodeWav(const AudioBuffer &audio) {
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(audio.samples.size() * 2);
  std::string s;
  s.reserve(44 + data_bytes);
  s += "RIFF";
  PutU32(s, 36 + data_bytes);
  s += "WAVEfmt ";
  PutU32(s, 16);
  PutU16(s, 1);  // PCM
  PutU16(s, 1);  // mono
  PutU32(s, static_cast<std::uint32_t>(audio.sample_rate));
  PutU32(s, static_cast<std::uint32_t>(audio.sample_rate) * 2);
  PutU16(s, 2);
  PutU16(s, 16);
  s += "data";
  PutU32(s, data_bytes);
  for (double v : audio.samples) {
    // same scale as decoding, so samples round-trip within half a step
    double q = std::clamp(std::round(v * 32768.0), -32768.0, 32767.0);
    PutU16(s, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  return s;
}

AudioBuffer DecodeWav(std::string_view b, const std::string &origin) {
  auto bad = [&](const std::string &why) {
    return Error(ErrorCode::kBadWav, origin + ": " + why);
  };
  if (b.size() < 12 || b.substr(0, 4) != "RIFF" || b.substr(8, 4) != "WAVE")
    throw bad("not a RIFF/WAVE file");
  AudioBuffer out;
  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= b.size()) {
    std::string_view id = b.substr(pos, 4);
    std::uint32_t size = GetU32(b, pos + 4);
    std::size_t body = pos + 8;
    if (body + size > b.size()) {
      // Tolerate a data chunk whose declared size runs past EOF.
      if (id != "data") throw bad("truncated chunk");
      size = static_cast<std::uint32_t>(b.size() - body);
    }
    if (id == "fmt ") {
      if (size < 16) throw bad("short fmt chunk");
      std::uint16_t format = GetU16(b, body);
      std::uint16_t channels = GetU16(b, body + 2);
      std::uint16_t bits = GetU16(b, body + 14);
      if (format != 1 || channels != 1 || bits != 16)
        throw bad("only 16-bit PCM mono is supported");
      out.sample_rate = static_cast<int>(GetU32(b, body + 4));
      if (out.sample_rate <= 0) throw bad("invalid sample rate");
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw bad("data chunk before fmt chunk");
      std::size_t n = size / 2;
      out.samples.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        auto raw = static_cast<std::int16_t>(GetU16(b, body + 2 * i));
        out.samples[i] = raw / 32768.0;
      }
      return out;
    }
    pos = body + size + (size & 1);
  }
  throw bad("no data chunk");
}

AudioBuffer ReadWav(const std::filesystem::path &path) {
  return DecodeWav(ReadFile(path), path.string());
}

void WriteWav(const std::filesystem::path &path, const AudioBuffer &audio) {
  WriteFileAtomic(path, EncodeWav(audio));
}

}  // namespace avsr
