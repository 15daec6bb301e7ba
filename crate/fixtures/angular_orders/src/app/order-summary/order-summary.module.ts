import { NgModule } from '@angular/core';
import { CommonModule } from '@angular/common';
import { HttpClientModule } from '@angular/common/http';
import { OrderSummaryComponent } from './order-summary.component';

@NgModule({
  declarations: [OrderSummaryComponent],
  imports: [CommonModule, HttpClientModule],
  exports: [OrderSummaryComponent],
})
export class OrderSummaryModule {}
