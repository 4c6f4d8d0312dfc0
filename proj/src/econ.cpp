#include "sinkplan/econ.hpp"

#include <cmath>

#include "sinkplan/error.hpp"

namespace sinkplan {

double output_value(double price, const TechSpec& tech) {
  return (price - tech.transport_storage) * tech.efficiency - tech.vom;
}

double product_price(double value, const TechSpec& tech) {
  if (!(tech.efficiency > 0.0)) throw Error("product_price: efficiency must be positive");
  return (value + tech.vom) / tech.efficiency + tech.transport_storage;
}

double crf(double wacc, double life) {
  if (!(life >= 1.0)) throw Error("crf: asset life must be at least one year");
  if (wacc == 0.0) return 1.0 / life;
  const double growth = std::pow(1.0 + wacc, life);
  return wacc * growth / (growth - 1.0);
}

double annualized_capex(double capex_per_kw, const FinanceSpec& fin) {
  return 1000.0 * capex_per_kw * (crf(fin.wacc, fin.life) + fin.fom_fraction);
}

double demand_curve_step(const DemandCurveSpec& spec, double annual_load) {
  const double anchor_quantity = spec.anchor_quantity_fraction * annual_load;
  const double slope = spec.anchor_price / (spec.elasticity * anchor_quantity);
  return std::abs(slope) * spec.segment_fraction * annual_load;
}

std::vector<MarketSegment> build_demand_curve(const DemandCurveSpec& spec, double annual_load) {
  if (!(annual_load > 0.0)) throw Error("build_demand_curve: annual load must be positive");
  if (!(spec.elasticity < 0.0)) throw Error("build_demand_curve: elasticity must be negative");
  if (!(spec.segment_fraction > 0.0) || spec.segment_fraction > spec.anchor_quantity_fraction)
    throw Error("build_demand_curve: segment fraction must lie in (0, anchor fraction]");

  const double step = demand_curve_step(spec, annual_load);
  const double width = spec.segment_fraction * annual_load;
  // Segments between zero quantity and the anchor; the last of them carries base_price.
  const auto above = static_cast<long>(
      std::floor(spec.anchor_quantity_fraction / spec.segment_fraction + 1e-9));

  std::vector<MarketSegment> out;
  auto push = [&](double value) {
    if (value <= 0.0) return;
    out.push_back({static_cast<int>(out.size()), width, value});
  };
  for (long k = above - 1; k >= 0; --k) push(spec.base_price + static_cast<double>(k) * step);
  for (long k = 1;; ++k) {
    const double value = spec.base_price - static_cast<double>(k) * step;
    if (value <= 1e-12 * step) break;
    push(value);
  }
  return out;
}

}  // namespace sinkplan
