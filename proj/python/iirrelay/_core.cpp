#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "iirrelay/channel.hpp"
#include "iirrelay/errors.hpp"
#include "iirrelay/harness.hpp"
#include "iirrelay/linkbudget.hpp"
#include "iirrelay/numerics.hpp"

namespace py = pybind11;
using namespace iirrelay;

namespace {

py::array_t<Complex> to_array(const CVec& v) {
  py::array_t<Complex> a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

CVec from_array(const py::array_t<Complex, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 1) throw InvalidInput("expected a 1-D array");
  return CVec(a.data(), a.data() + a.size());
}

Figure parse_figure(const std::string& name) {
  if (name == "fig2") return Figure::gain_sweep;
  if (name == "fig3") return Figure::ber_no_direct;
  if (name == "fig4") return Figure::ber_direct;
  if (name == "fig5") return Figure::ber_rsi;
  throw InvalidInput("figure must be fig2, fig3, fig4 or fig5");
}

std::string as_config_value(const py::handle& v) {
  if (py::isinstance<py::bool_>(v)) return v.cast<bool>() ? "true" : "false";
  if (py::isinstance<py::str>(v)) return v.cast<std::string>();
  if (py::isinstance<py::list>(v) || py::isinstance<py::tuple>(v)) {
    std::string s;
    for (const auto& item : v) {
      if (!s.empty()) s += ',';
      s += as_config_value(item);
    }
    return s;
  }
  if (py::isinstance<py::int_>(v)) return std::to_string(v.cast<long long>());
  if (PyComplex_Check(v.ptr())) {
    const auto c = v.cast<Complex>();
    return "(" + format_number(c.real()) + "," + format_number(c.imag()) + ")";
  }
  return format_number(v.cast<double>());
}

py::dict sweep_to_dict(const SweepResult& r) {
  py::dict d;
  d["sweep"] = r.sweep_name;
  py::list records;
  for (const auto& rec : r.records) {
    py::dict x;
    x["scheme"] = std::string(to_string(rec.scheme));
    x[py::str(r.sweep_name)] = rec.sweep_value;
    x["bits"] = rec.bits;
    x["errors"] = rec.errors;
    x["ber"] = rec.ber;
    records.append(x);
  }
  d["records"] = records;
  py::list points;
  for (const auto& p : r.gain_points) {
    py::dict x;
    x["beta2"] = p.beta2;
    x["alpha"] = p.alpha;
    x["gamma_db_analytic"] = p.gamma_db_analytic;
    x["gamma_db_measured"] = p.gamma_db_measured;
    x["gamma_pre_db_analytic"] = p.gamma_pre_db_analytic;
    x["gamma_pre_db_measured"] = p.gamma_pre_db_measured;
    x["optimum"] = p.optimum;
    points.append(x);
  }
  d["gain_points"] = points;
  py::dict meta;
  for (const auto& [k, v] : r.metadata) meta[py::str(k)] = v;
  d["metadata"] = meta;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Full-duplex AF relay OFDM simulator core";
  m.attr("__version__") = version_string();

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  static py::exception<InvalidInput> invalid(m, "InvalidInput", error.ptr());
  static py::exception<StabilityError> unstable(m, "StabilityError", error.ptr());
  static py::exception<DegenerateChannel> degenerate(m, "DegenerateChannel", error.ptr());
  static py::exception<SingularSubcarrier> singular(m, "SingularSubcarrier", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InvalidInput& e) {
      py::set_error(invalid, e.what());
    } catch (const StabilityError& e) {
      py::set_error(unstable, e.what());
    } catch (const DegenerateChannel& e) {
      py::set_error(degenerate, e.what());
    } catch (const SingularSubcarrier& e) {
      py::set_error(singular, e.what());
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<ChannelRealization>(m, "Channel")
      .def(py::init([](Complex h_sr, Complex h_rd, Complex h_rr, Complex h_sd, double sigma2_R, double sigma2_D) {
             return ChannelRealization{h_sr, h_rd, h_rr, h_sd, sigma2_R, sigma2_D};
           }),
           py::arg("h_sr") = Complex{1.0, 0.0}, py::arg("h_rd") = Complex{1.0, 0.0}, py::arg("h_rr") = Complex{},
           py::arg("h_sd") = Complex{}, py::arg("sigma2_R") = 0.1, py::arg("sigma2_D") = 0.1)
      .def_readwrite("h_sr", &ChannelRealization::h_sr)
      .def_readwrite("h_rd", &ChannelRealization::h_rd)
      .def_readwrite("h_rr", &ChannelRealization::h_rr)
      .def_readwrite("h_sd", &ChannelRealization::h_sd)
      .def_readwrite("sigma2_R", &ChannelRealization::sigma2_R)
      .def_readwrite("sigma2_D", &ChannelRealization::sigma2_D)
      .def_static(
          "draw",
          [](std::uint64_t seed, double snr_c_db, double rsi_db, double direct_pathloss_db) {
            Rng rng(seed);
            return draw_channels(rng, ChannelConfig::from_db(snr_c_db, rsi_db, direct_pathloss_db));
          },
          py::arg("seed"), py::arg("snr_c_db") = 10.0, py::arg("rsi_db") = -15.0,
          py::arg("direct_pathloss_db") = -1.0, "Rayleigh draw; a negative path loss disables the direct link.")
      .def("__repr__", [](const ChannelRealization& c) {
        return "Channel(h_sr=" + py::repr(py::cast(c.h_sr)).cast<std::string>() +
               ", h_rd=" + py::repr(py::cast(c.h_rd)).cast<std::string>() +
               ", h_rr=" + py::repr(py::cast(c.h_rr)).cast<std::string>() +
               ", h_sd=" + py::repr(py::cast(c.h_sd)).cast<std::string>() + ")";
      });

  py::class_<IirCoefficients>(m, "Coefficients")
      .def_readonly("a0", &IirCoefficients::a0)
      .def_readonly("a1", &IirCoefficients::a1)
      .def_readonly("b0", &IirCoefficients::b0)
      .def_readonly("b1", &IirCoefficients::b1)
      .def_property_readonly("pole", &IirCoefficients::pole);

  m.def("dft", [](const py::array_t<Complex, py::array::c_style | py::array::forcecast>& v) {
    return to_array(dft(from_array(v)));
  });
  m.def("idft", [](const py::array_t<Complex, py::array::c_style | py::array::forcecast>& v) {
    return to_array(idft(from_array(v)));
  });
  m.def("is_stable", &is_stable, py::arg("beta"), py::arg("h_rr"));
  m.def("beta_from_alpha", &beta_from_alpha, py::arg("alpha"), py::arg("h_rr"));
  m.def("compute_coeffs", &compute_coeffs, py::arg("channel"), py::arg("beta"));

  m.def(
      "budget",
      [](const ChannelRealization& ch, double beta, std::size_t n) {
        const auto b = budget(ch, beta, n);
        py::dict d;
        d["alpha"] = b.alpha;
        d["beta"] = b.beta;
        d["P_D"] = b.P_D;
        d["P_R1"] = b.P_R1;
        d["P_n"] = b.P_n;
        d["P_R2"] = b.P_R2;
        d["P_R"] = b.P_R;
        d["P_y"] = b.P_y;
        d["P_GI"] = b.P_GI;
        d["sigma_x2"] = b.sigma_x2;
        d["eta"] = b.eta;
        d["gamma"] = b.gamma;
        d["gamma_pre"] = b.gamma_pre;
        d["delta"] = b.delta;
        d["degenerate"] = b.degenerate;
        return d;
      },
      py::arg("channel"), py::arg("beta"), py::arg("n") = 128);

  auto solution = [](const GainSolution& s) {
    py::dict d;
    d["alpha_star"] = s.alpha_star ? py::cast(*s.alpha_star) : py::none();
    d["beta_star"] = s.beta_star;
    d["gamma_star"] = s.gamma_star;
    return d;
  };
  m.def(
      "optimize_gain",
      [solution](const ChannelRealization& ch, std::size_t n) { return solution(optimize_gain(ch, n)); },
      py::arg("channel"), py::arg("n") = 128);
  m.def(
      "optimize_prefilter_gain",
      [solution](const ChannelRealization& ch) { return solution(optimize_prefilter_gain(ch)); },
      py::arg("channel"));

  m.def(
      "measure_snr",
      [](const std::string& scheme, const ChannelRealization& ch, double beta, std::size_t n, std::size_t blocks,
         std::size_t frames, std::uint64_t seed, bool with_direct) {
        const Scheme sc = parse_scheme(scheme);
        MeasuredSnr r;
        {
          py::gil_scoped_release release;
          r = measure_snr(sc, ch, beta, n, blocks, frames, seed, with_direct);
        }
        py::dict d;
        d["signal_power"] = r.signal_power;
        d["noise_power"] = r.noise_power;
        d["error_power"] = r.error_power;
        d["samples"] = r.samples;
        d["snr"] = r.snr();
        d["sinr"] = r.sinr();
        return d;
      },
      py::arg("scheme"), py::arg("channel"), py::arg("beta"), py::arg("n") = 128, py::arg("blocks") = 50,
      py::arg("frames") = 20, py::arg("seed") = 1, py::arg("with_direct") = false);

  m.def(
      "simulate_frame",
      [](const std::string& scheme, const ChannelRealization& ch, double beta, std::size_t n, std::size_t blocks,
         std::uint64_t seed, bool with_direct, bool noiseless) {
        const auto t = simulate_frame(parse_scheme(scheme), ch, beta, n, blocks, seed, with_direct, noiseless);
        py::dict d;
        d["tx"] = to_array(t.tx);
        d["y"] = to_array(t.y);
        py::list eq;
        for (const auto& b : t.equalized) eq.append(to_array(b));
        d["equalized"] = eq;
        d["symbol_power"] = t.symbol_power;
        d["bits"] = t.ber.bits;
        d["errors"] = t.ber.errors;
        return d;
      },
      py::arg("scheme"), py::arg("channel"), py::arg("beta"), py::arg("n") = 128, py::arg("blocks") = 50,
      py::arg("seed") = 1, py::arg("with_direct") = false, py::arg("noiseless") = false);

  m.def(
      "run_figure",
      [](const std::string& figure, const py::dict& options) {
        const Figure f = parse_figure(figure);
        SimConfig cfg = SimConfig::defaults(f);
        for (const auto& [k, v] : options) cfg.set(py::str(k), as_config_value(v));
        cfg.validate();
        SweepResult r;
        {
          py::gil_scoped_release release;
          switch (f) {
            case Figure::gain_sweep: r = run_fig2(cfg); break;
            case Figure::ber_no_direct: r = run_fig3(cfg); break;
            case Figure::ber_direct: r = run_fig4(cfg); break;
            case Figure::ber_rsi: r = run_fig5(cfg); break;
          }
        }
        return sweep_to_dict(r);
      },
      py::arg("figure"), py::arg("options") = py::dict(),
      "Run fig2..fig5; options are config keys (n, frames, snr_c_db, schemes, beta_policy, ...).");
}
