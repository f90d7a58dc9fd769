/** The seven figure presets and the CSV each one consumes. */

import { FigureSpec } from "./chart.js";

export interface Preset extends FigureSpec {
  input: string;
  output: string;
}

export const PRESETS: Record<string, Preset> = {
  fig4: {
    input: "ber-fig4.csv",
    output: "fig4.svg",
    title: "BER vs SNR (RCD 0.5, N = 40)",
    xLabel: "SNR (dB)",
    yLabel: "BER",
    yScale: "log",
  },
  fig6: {
    input: "balance-fig6.csv",
    output: "fig6.svg",
    title: "Conditional error rates vs SNR (balance check)",
    xLabel: "SNR (dB)",
    yLabel: "P(decide 1 | bit 0), P(decide 0 | bit 1)",
    yScale: "log",
  },
  fig7: {
    input: "ber-fig7.csv",
    output: "fig7.svg",
    title: "BER vs block length (SNR 10 dB, RCD 0.5)",
    xLabel: "samples per bit N",
    yLabel: "BER",
    yScale: "log",
  },
  fig8: {
    input: "ber-fig8.csv",
    output: "fig8.svg",
    title: "BER vs relative channel difference (SNR 10 dB, N = 40)",
    xLabel: "RCD",
    yLabel: "BER",
    yScale: "log",
  },
  "fig9-target": {
    input: "outage-fig9-target.csv",
    output: "fig9-target.svg",
    title: "Outage and floor-exceedance probability vs target BER",
    xLabel: "target BER",
    yLabel: "probability",
    yScale: "log",
  },
  "fig9-snr": {
    input: "outage-fig9-snr.csv",
    output: "fig9-snr.svg",
    title: "Outage and floor-exceedance probability vs SNR",
    xLabel: "SNR (dB)",
    yLabel: "probability",
    yScale: "log",
  },
  fig10: {
    input: "training-fig10.csv",
    output: "fig10.svg",
    title: "BER vs number of training blocks (SNR 10 dB, N = 40)",
    xLabel: "training blocks per frame",
    yLabel: "BER",
    yScale: "log",
  },
};
