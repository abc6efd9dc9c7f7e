// avsr/error.h

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

#ifndef AVSR_ERROR_H_
#define AVSR_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace avsr {

/// Every failure the toolkit reports. Grouped by module; the CLI maps the
/// config group to exit code 2 and everything else to exit code 3.
enum class ErrorCode {
  // noisemix
  kSilentNoise,
  kSilentSpeech,
  kRateMismatch,
  kPeakExceeded,
  kBadWav,
  // scoring
  kEmptyReference,
  kZeroBaseline,
  kInvalidToken,
  kMissingReference,
  // gaincurve
  kInvalidCurve,
  kOutOfRange,
  kRefOutOfRange,
  kNoCrossing,
  // occlusion
  kMalformedLine,
  kOverlapDetected,
  kTierNotFound,
  kMalformedFile,
  kFrameIndexOutOfRange,
  kRegionOutOfBounds,
  kBadImage,
  // mafi-stats
  kOutOfVocabulary,
  kEmptyTarget,
  kDuplicateWord,
  kScoreOutOfRange,
  kLengthMismatch,
  kConstantInput,
  kEmptyIntersection,
  kInvalidArgument,
  // cli-report
  kRaggedRows,
  kEmptyInput,
  kConfig,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

/// True for errors caused by a bad configuration or command line rather than
/// by the data being processed.
bool IsConfigError(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  /// Attaches a source location (file and 1-based line, 0 if unknown).
  Error(ErrorCode code, const std::string &message, std::string file,
        int line)
      : std::runtime_error(message),
        code_(code),
        file_(std::move(file)),
        line_(line) {}

  ErrorCode code() const { return code_; }
  const std::string &file() const { return file_; }
  int line() const { return line_; }

 private:
  ErrorCode code_;
  std::string file_;
  int line_ = 0;
};

}  // namespace avsr

#endif  // AVSR_ERROR_H_
