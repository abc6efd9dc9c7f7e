// avsr/noisemix.h

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

// Noisy test-condition construction: seeded pink noise and mixing at a
// calibrated signal-to-noise ratio. SNR is measured over the whole buffer as
// 10*log10 of the mean-square power ratio.

#ifndef AVSR_NOISEMIX_H_
#define AVSR_NOISEMIX_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace avsr {

/// Mono audio with samples nominally in [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = 16000;

  double duration() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

enum class PeakPolicy { kRescale, kClip, kError };

PeakPolicy ParsePeakPolicy(std::string_view name);
std::string_view PeakPolicyName(PeakPolicy policy);

struct MixSpec {
  double target_snr_db = 0.0;
  std::uint64_t seed = 0;
  PeakPolicy peak_policy = PeakPolicy::kRescale;
};

struct MixResult {
  AudioBuffer mixture;
  /// Gain applied to the (tiled/truncated) noise before summation.
  double noise_scale = 1.0;
  /// Gain applied to the whole mixture by the peak policy (1 when unused).
  double mixture_gain = 1.0;
  /// Number of samples hard-limited under PeakPolicy::kClip.
  std::size_t clipped_samples = 0;
};

/// Mean-square amplitude.
double MeanPower(std::span<const double> samples);

/// Pink (1/f power) Gaussian noise by spectral shaping: a white complex
/// Gaussian spectrum is weighted by 1/sqrt(f), the DC bin is zeroed, and the
/// inverse real FFT is scaled to a peak of 0.9. Bit-identical for identical
/// arguments.
AudioBuffer GeneratePinkNoise(std::size_t n_samples, int sample_rate,
                              std::uint64_t seed);

/// 10*log10(P_speech / P_noise). Throws kRateMismatch, kSilentSpeech,
/// kSilentNoise.
double MeasureSnr(const AudioBuffer &speech, const AudioBuffer &noise);

/// Noise tiled (wrapped) or truncated from offset 0 to `length` samples.
std::vector<double> FitNoiseLength(std::span<const double> noise,
                                   std::size_t length);

/// Scales the fitted noise so the speech-to-noise ratio equals the target,
/// adds it to the speech, then applies the peak policy. kRescale only acts
/// when the mixture peak exceeds 1.
MixResult MixAtSnr(const AudioBuffer &speech, const AudioBuffer &noise,
                   const MixSpec &spec);

// ---- 16-bit PCM mono WAV ----------------------------------------------------

AudioBuffer ReadWav(const std::filesystem::path &path);

/// Quantizes to 16-bit PCM (round to nearest, clamped) and writes atomically.
void WriteWav(const std::filesystem::path &path, const AudioBuffer &audio);

std::string EncodeWav(const AudioBuffer &audio);
AudioBuffer DecodeWav(std::string_view bytes, const std::string &origin);

}  // namespace avsr

#endif  // AVSR_NOISEMIX_H_
