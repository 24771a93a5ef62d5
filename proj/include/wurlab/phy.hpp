#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace wurlab {

// LoRa chirp-spread-spectrum spreading factor. Valid range is 7..12; higher
// values give longer, more robust frames.
class SpreadingFactor {
 public:
  static constexpr int kMin = 7;
  static constexpr int kMax = 12;

  explicit SpreadingFactor(int value) : value_(value) {
    if (value < kMin || value > kMax) {
      throw std::invalid_argument("spreading factor must be in [7,12], got " +
                                  std::to_string(value));
    }
  }

  int value() const { return value_; }

  friend bool operator==(SpreadingFactor a, SpreadingFactor b) { return a.value_ == b.value_; }

 private:
  int value_;
};

// Radio parameters shared by all frames: chirp bandwidth (the symbol-rate
// denominator), message payload size, and the smallest SF at which low
// data rate optimization kicks in (13 disables it entirely). The 4/5 code
// rate and 20.25-symbol frame overhead are fixed by the airtime formula.
struct PhyParams {
  double bandwidth_hz = 125000.0;
  int payload_bytes = 10;
  int ldro_threshold_sf = 11;

  PhyParams with_payload(int bytes) const {
    PhyParams p = *this;
    p.payload_bytes = bytes;
    return p;
  }

  bool operator==(const PhyParams&) const = default;
};

// The contiguous SF set {7, ..., max_sf} used on the device-to-UAV uplink;
// each transmission picks one member uniformly at random.
class SfSet {
 public:
  explicit SfSet(int max_sf) : max_sf_(SpreadingFactor(max_sf).value()) {}

  int max_sf() const { return max_sf_; }
  int min_sf() const { return SpreadingFactor::kMin; }
  int size() const { return max_sf_ - SpreadingFactor::kMin + 1; }
  bool contains(int sf) const { return sf >= min_sf() && sf <= max_sf_; }

  friend bool operator==(SfSet a, SfSet b) { return a.max_sf_ == b.max_sf_; }

 private:
  int max_sf_;
};

// Airtime of one uplink frame, in seconds:
//   [20.25 + max{5*ceil((2b - k + 11) / (k - 2q)), 0}] * 2^k / w
// where k is the SF, b the payload bytes, w the bandwidth and q the low
// data rate optimization flag.
inline double frame_airtime(SpreadingFactor sf, const PhyParams& phy) {
  if (!(phy.bandwidth_hz > 0.0)) {
    throw std::invalid_argument("bandwidth_hz must be positive");
  }
  if (phy.payload_bytes < 1) {
    throw std::invalid_argument("payload_bytes must be >= 1");
  }
  const int k = sf.value();
  const int q = k >= phy.ldro_threshold_sf ? 1 : 0;
  const int numerator = 2 * phy.payload_bytes - k + 11;
  const int denominator = k - 2 * q;  // >= 5 for any valid SF and q
  // For numerator <= 0 the ceil is non-positive and the max clamps it away.
  const int payload_symbols =
      numerator > 0 ? 5 * ((numerator + denominator - 1) / denominator) : 0;
  const double symbols = 20.25 + static_cast<double>(payload_symbols);
  return symbols * std::ldexp(1.0, k) / phy.bandwidth_hz;
}

// Probability that a given member of the set is chosen for a frame; the
// choice is uniform, so this is 1/|set| for every member.
inline double sf_probability(const SfSet& sf_set) {
  return 1.0 / static_cast<double>(sf_set.size());
}

// Uplink slot length: just long enough for the slowest frame in the set,
// i.e. the airtime at the largest SF.
inline double slot_length(const SfSet& sf_set, const PhyParams& phy) {
  return frame_airtime(SpreadingFactor(sf_set.max_sf()), phy);
}

inline double dbm_to_milliwatts(double dbm) { return std::pow(10.0, dbm / 10.0); }

}  // namespace wurlab
