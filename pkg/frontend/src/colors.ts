// Fixed presentation palettes. Asset categories get one row color each (the
// five-color set documented in the README); severity bands reuse the same
// fills as the service's SVG heat map so both views agree visually.

export const CATEGORY_COLORS: Record<string, string> = {
  PureInformation: "#dbeafe",
  PhysicalHardware: "#fde8cd",
  Software: "#dcf3dc",
  Reputation: "#f3ddf3",
  HumanResource: "#fdf3c9",
};

export const BAND_COLORS: Record<string, string> = {
  RED: "#d9534f",
  YELLOW: "#f0ad4e",
  GREEN: "#5cb85c",
  MONITOR: "#d8d8d8",
};

const UNKNOWN_COLOR = "#eeeeee";

export function categoryColor(category: string): string {
  return CATEGORY_COLORS[category] ?? UNKNOWN_COLOR;
}

export function bandColor(band: string): string {
  return BAND_COLORS[band] ?? UNKNOWN_COLOR;
}
