#include "ota/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace ota {

ChannelSpec ChannelSpec::from_sigma(double power, double sigma2) {
  if (!(power > 0.0)) throw std::invalid_argument("ChannelSpec: power must be positive");
  if (!(sigma2 >= 0.0)) throw std::invalid_argument("ChannelSpec: sigma2 must be nonnegative");
  return ChannelSpec{sigma2, power};
}

ChannelSpec ChannelSpec::from_snr(double power, double snr) {
  if (!(power > 0.0)) throw std::invalid_argument("ChannelSpec: power must be positive");
  if (!(snr > 0.0)) throw std::invalid_argument("ChannelSpec: snr must be positive");
  return ChannelSpec{power / snr, power};
}

void PowerLedger::record(double energy, std::uint64_t uses) {
  if (!(energy >= 0.0)) throw std::invalid_argument("PowerLedger: negative energy");
  total_energy += energy;
  total_uses += uses;
}

void PowerLedger::merge(const PowerLedger& other) {
  total_energy += other.total_energy;
  total_uses += other.total_uses;
}

double PowerLedger::average() const {
  if (total_uses == 0) throw std::runtime_error("PowerLedger: empty ledger");
  return total_energy / static_cast<double>(total_uses);
}

std::vector<double> transmit(const ChannelSpec& spec, const std::vector<double>& codeword,
                             Rng& rng, PowerLedger& ledger) {
  if (codeword.empty()) throw std::invalid_argument("transmit: empty codeword");
  const double sigma = std::sqrt(spec.sigma2);
  std::vector<double> out(codeword.size());
  double energy = 0.0;
  for (std::size_t i = 0; i < codeword.size(); ++i) {
    energy += codeword[i] * codeword[i];
    out[i] = codeword[i] + rng.gaussian(sigma);
  }
  ledger.record(energy, codeword.size());
  return out;
}

PowerAudit audit_power(const PowerLedger& ledger, const ChannelSpec& spec, double tolerance) {
  if (tolerance < 0.0) throw std::invalid_argument("audit_power: negative tolerance");
  const double avg = ledger.average();
  const double ratio = avg / spec.power;
  return PowerAudit{ratio <= 1.0 + tolerance, avg, ratio};
}

}  // namespace ota
