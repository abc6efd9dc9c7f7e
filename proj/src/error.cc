// src/error.cc

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

#include "avsr/error.h"

namespace avsr {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSilentNoise: return "SilentNoise";
    case ErrorCode::kSilentSpeech: return "SilentSpeech";
    case ErrorCode::kRateMismatch: return "RateMismatch";
    case ErrorCode::kPeakExceeded: return "PeakExceeded";
    case ErrorCode::kBadWav: return "BadWav";
    case ErrorCode::kEmptyReference: return "EmptyReference";
    case ErrorCode::kZeroBaseline: return "ZeroBaseline";
    case ErrorCode::kInvalidToken: return "InvalidToken";
    case ErrorCode::kMissingReference: return "MissingReference";
    case ErrorCode::kInvalidCurve: return "InvalidCurve";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kRefOutOfRange: return "RefOutOfRange";
    case ErrorCode::kNoCrossing: return "NoCrossing";
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kOverlapDetected: return "OverlapDetected";
    case ErrorCode::kTierNotFound: return "TierNotFound";
    case ErrorCode::kMalformedFile: return "MalformedFile";
    case ErrorCode::kFrameIndexOutOfRange: return "FrameIndexOutOfRange";
    case ErrorCode::kRegionOutOfBounds: return "RegionOutOfBounds";
    case ErrorCode::kBadImage: return "BadImage";
    case ErrorCode::kOutOfVocabulary: return "OutOfVocabulary";
    case ErrorCode::kEmptyTarget: return "EmptyTarget";
    case ErrorCode::kDuplicateWord: return "DuplicateWord";
    case ErrorCode::kScoreOutOfRange: return "ScoreOutOfRange";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kConstantInput: return "ConstantInput";
    case ErrorCode::kEmptyIntersection: return "EmptyIntersection";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kRaggedRows: return "RaggedRows";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

bool IsConfigError(ErrorCode code) {
  return code == ErrorCode::kConfig || code == ErrorCode::kInvalidArgument;
}

}  // namespace avsr
