#pragma once

#include <cstdint>
#include <vector>

#include "ota/rng.hpp"

namespace ota {

// Memoryless real AWGN channel with an average power budget per use.
struct ChannelSpec {
  double sigma2;  // noise variance per use, >= 0
  double power;   // budget P, > 0

  double snr() const { return power / sigma2; }

  static ChannelSpec from_sigma(double power, double sigma2);
  static ChannelSpec from_snr(double power, double snr);
};

// Running energy/use account across transmissions. Mergeable so parallel
// runs can be combined.
struct PowerLedger {
  double total_energy = 0.0;
  std::uint64_t total_uses = 0;

  void record(double energy, std::uint64_t uses);
  void merge(const PowerLedger& other);
  double average() const;
};

struct PowerAudit {
  bool ok;
  double average_power;
  double excess_ratio;  // average / budget
};

// y = c + z, z iid N(0, sigma2). Appends the codeword's energy and length to
// the ledger. sigma2 == 0 passes the codeword through exactly.
std::vector<double> transmit(const ChannelSpec& spec, const std::vector<double>& codeword,
                             Rng& rng, PowerLedger& ledger);

// Checks average power <= P * (1 + tolerance).
PowerAudit audit_power(const PowerLedger& ledger, const ChannelSpec& spec, double tolerance);

}  // namespace ota
