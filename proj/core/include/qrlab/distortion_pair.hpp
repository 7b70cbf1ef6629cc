#pragma once

namespace qrlab {

// Constants of the distortion inequality |Df|^n <= K1 |J| + K2, with
// 0 < K1 < inf and 0 <= K2 < inf.
class DistortionPair {
 public:
  DistortionPair(double k1, double k2);

  double k1() const { return k1_; }
  double k2() const { return k2_; }

  bool operator==(const DistortionPair&) const = default;

 private:
  double k1_;
  double k2_;
};

}  // namespace qrlab
