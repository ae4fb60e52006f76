/** Headless SVG rendering through the echarts server-side renderer. */

import * as echarts from "echarts";

export function renderSvg(
  option: echarts.EChartsOption,
  width = 820,
  height = 560,
): string {
  const chart = echarts.init(null, null, {
    renderer: "svg",
    ssr: true,
    width,
    height,
  });
  chart.setOption({ animation: false, ...option });
  const svg = chart.renderToSVGString();
  chart.dispose();
  return svg;
}

/**
 * Canonicalize the renderer-generated identifiers (a process-global
 * instance counter leaks into CSS class names), so that outputs from
 * identical inputs compare byte-equal.
 */
export function normalizeRendererIds(svg: string): string {
  const seen = new Map<string, string>();
  return svg
    .replace(/zr\d+-cls-\d+/g, (match) => {
      if (!seen.has(match)) {
        seen.set(match, `zr-cls-${seen.size}`);
      }
      return seen.get(match)!;
    })
    .replace(/zr\d+-/g, "zr-");
}
