#pragma once

#include <vector>

namespace sinkplan {

/// Conversion constants for a concrete demand-sink product.
struct TechSpec {
  double efficiency = 1.0;         // product units per MWh of input electricity
  double vom = 0.0;                // $/MWh-input, non-electricity variable cost
  double transport_storage = 0.0;  // $/product unit
};

struct FinanceSpec {
  double wacc = 0.071;
  double life = 20.0;          // years
  double fom_fraction = 0.04;  // fraction of capex per year
};

/// Parameters of the linear product-demand curve and its stepwise approximation.
struct DemandCurveSpec {
  double anchor_price = 50.0;             // $/MWh-input at the anchor quantity
  double anchor_quantity_fraction = 0.20; // anchor quantity as a fraction of annual load
  double elasticity = -0.8;
  double segment_fraction = 0.01;         // segment width as a fraction of annual load
  double base_price = 50.0;               // value assigned to the segment ending at the anchor
};

/// One step of the product demand curve.
struct MarketSegment {
  int index = 0;
  double max_supply = 0.0;  // MWh per year
  double value = 0.0;       // $/MWh-input
};

/// Net value per MWh of input: (price - T&S) * efficiency - VOM.
double output_value(double price, const TechSpec& tech);

/// Product price that yields `value`; inverse of output_value. Throws on efficiency <= 0.
double product_price(double value, const TechSpec& tech);

/// End-of-year capital recovery factor. life < 1 throws.
double crf(double wacc, double life);

/// Annualized capex plus fixed O&M in $/MW-yr for a capex given in $/kW.
double annualized_capex(double capex_per_kw, const FinanceSpec& fin);

/// Price change between adjacent segments ($/MWh-input).
double demand_curve_step(const DemandCurveSpec& spec, double annual_load);

/// Stepwise demand curve sorted by descending value. Segments with non-positive value are dropped.
std::vector<MarketSegment> build_demand_curve(const DemandCurveSpec& spec, double annual_load);

}  // namespace sinkplan
