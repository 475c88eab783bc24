// Payload shapes returned by the plant-operations service. The console
// renders these verbatim: every number on screen comes from a payload.

export interface OfferPayload {
  schema_version: string;
  operation: 'offer' | 'pre_offer';
  date: string;
  availability_mw: number;
  period_values_mw: number[];
  csv_locator: string;
}

export interface PeriodDecision {
  period: number;
  committed_mw: number;
  intraday_mw: number;
  band_low: number;
  band_high: number;
  outside_band: boolean;
}

export interface RedispatchPayload {
  schema_version: string;
  date: string;
  margin: number;
  redispatch_required: boolean;
  periods: PeriodDecision[];
  csv_locator: string;
}

export interface HeatmapCell {
  hour: number;
  horizon: number;
  model: string | null;
  value: number | null;
  per_model: Record<string, number>;
}

export interface HeatmapPayload {
  schema_version: string;
  metric: string;
  option: number;
  hours: number[];
  horizons: number[];
  cells: HeatmapCell[];
}

export interface UploadSummary {
  schema_version: string;
  series_id: string;
  rows: number;
  resolution_minutes: number;
  missing_percent: Record<string, number>;
  clip_counts: Record<string, number>;
}

export interface PlantList {
  schema_version: string;
  plants: string[];
}

export interface OfferRequest {
  operation: 'offer' | 'pre_offer';
  date?: string;
  availability: number;
  plant_config_id?: string;
  gfs_source: string;
  historical_source?: string;
}

export interface RedispatchRequest {
  date: string;
  margin?: number;
  plant_config_id?: string;
  path_daycast?: string;
  path_hourcast?: string;
  path_instacast?: string;
  historical_source?: string;
}

// Measurement-file header the service requires, surfaced on upload errors.
export const EXPECTED_UPLOAD_COLUMNS = [
  'Fecha',
  'GHI',
  'Presion',
  'Temperatura Ambiente',
  'Wind Speed',
  'Wind Direction',
] as const;
