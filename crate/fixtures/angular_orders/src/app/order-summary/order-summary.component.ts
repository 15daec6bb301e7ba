import { Component, OnInit } from '@angular/core';
import { Observable } from 'rxjs';
import { OrderSummary, OrderSummaryService } from './order-summary.service';

@Component({
  selector: 'app-order-summary',
  templateUrl: './order-summary.component.html',
  styleUrls: ['./order-summary.component.css'],
})
export class OrderSummaryComponent implements OnInit {
  summary$!: Observable<OrderSummary>;

  constructor(private readonly summaryService: OrderSummaryService) {}

  ngOnInit(): void {
    this.summary$ = this.summaryService.loadSummary(42);
  }

  /** Formats a total for display. */
  formatTotal(total: number): string {
    return `$${total.toFixed(2)}`;
  }
}
