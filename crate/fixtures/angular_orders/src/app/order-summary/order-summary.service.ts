import { Injectable } from '@angular/core';
import { HttpClient } from '@angular/common/http';
import { Observable, map } from 'rxjs';

export interface OrderSummary {
  orderCount: number;
  total: number;
}

@Injectable({ providedIn: 'root' })
export class OrderSummaryService {
  constructor(private readonly http: HttpClient) {}

  /** Fetches the order summary for one customer. */
  loadSummary(customerId: number): Observable<OrderSummary> {
    return this.http
      .get<OrderSummary[]>(`/api/v1/customers/${customerId}/orders`)
      .pipe(map((orders) => summarize(orders)));
  }
}

/** Folds order rows into a single summary. */
export function summarize(rows: OrderSummary[]): OrderSummary {
  return {
    orderCount: rows.length,
    total: rows.reduce((sum, row) => sum + row.total, 0),
  };
}
