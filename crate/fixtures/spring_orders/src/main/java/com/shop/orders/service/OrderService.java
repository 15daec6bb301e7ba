package com.shop.orders.service;

import com.shop.orders.domain.Order;

public interface OrderService {

    Order createOrder(Long customerId, String sku, int quantity);

    Order findOrder(Long id);
}
